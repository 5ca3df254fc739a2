mod temperature {
    pub fn to_fahrenheit(celsius: f64) -> f64 {
        celsius * 9.0 / 5.0 + 32.0
    }
}

fn main() {
    println!("{:.1}", temperature::to_fahrenheit(36.6));
}
