public static class Parser
{
    public static int ParseOr(string s, int fallback)
    {
        return int.TryParse(s, out var value) ? value : fallback;
    }
}
