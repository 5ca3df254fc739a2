package main

import "fmt"

const greeting = `Hello,
raw world`

func main() {
	fmt.Println(greeting)
}
