using System.IO;

public static class Files
{
    public static int CountLines(string path)
    {
        int lines = 0;
        using (var reader = new StreamReader(path))
        {
            while (reader.ReadLine() != null)
                lines++;
        }
        return lines;
    }
}
