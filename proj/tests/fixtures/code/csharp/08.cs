public enum Color { Red, Green, Blue }

public static class ColorInfo
{
    public static string Describe(Color c)
    {
        switch (c)
        {
            case Color.Red: return "warm";
            case Color.Blue: return "cool";
            default: return "neutral";
        }
    }
}
