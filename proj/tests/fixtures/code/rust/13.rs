fn fib(n: u32) -> u64 {
    /* iterative, /* nested */ comment */
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}
