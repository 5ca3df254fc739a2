public static class Palindrome
{
    public static bool Check(string s)
    {
        int i = 0, j = s.Length - 1;
        while (i < j)
        {
            if (char.ToLower(s[i]) != char.ToLower(s[j]))
                return false;
            i++;
            j--;
        }
        return true;
    }
}
