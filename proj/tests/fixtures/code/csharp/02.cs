public class Stack<T>
{
    private readonly List<T> _items = new List<T>();

    public void Push(T item) => _items.Add(item);

    public T Pop()
    {
        if (_items.Count == 0)
            throw new InvalidOperationException("stack is empty");
        var last = _items[_items.Count - 1];
        _items.RemoveAt(_items.Count - 1);
        return last;
    }
}
