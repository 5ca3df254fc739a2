package main

import (
	"fmt"
	"sort"
)

func main() {
	names := []string{"delta", "alpha", "charlie"}
	sort.Strings(names)
	fmt.Println(names) // sorted output
}
