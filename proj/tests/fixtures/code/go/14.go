package main

import "fmt"

type Celsius float64

func (c Celsius) Fahrenheit() float64 {
	return float64(c)*9/5 + 32
}

func main() {
	fmt.Printf("%.1f\n", Celsius(36.6).Fahrenheit())
}
