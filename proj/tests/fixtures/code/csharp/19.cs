using System.Collections.Generic;

public static class Fib
{
    public static IEnumerable<long> Sequence(int count)
    {
        long a = 0, b = 1;
        for (int i = 0; i < count; i++)
        {
            yield return a;
            (a, b) = (b, a + b);
        }
    }
}
