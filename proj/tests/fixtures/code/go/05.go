package main

import (
	"errors"
	"fmt"
)

var ErrNegative = errors.New("negative input")

func sqrtInt(n int) (int, error) {
	if n < 0 {
		return 0, ErrNegative
	}
	r := 0
	for (r+1)*(r+1) <= n {
		r++
	}
	return r, nil
}

func main() {
	fmt.Println(sqrtInt(17))
}
