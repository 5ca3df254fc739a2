fn gcd(mut a: u64, mut b: u64) -> u64 {
    // Euclid
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}
