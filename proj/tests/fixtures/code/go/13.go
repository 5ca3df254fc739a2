package main

import (
	"fmt"
	"os"
)

func main() {
	data, err := os.ReadFile("config.txt")
	if err != nil {
		fmt.Fprintln(os.Stderr, "read failed:", err)
		os.Exit(1)
	}
	fmt.Print(string(data))
}
