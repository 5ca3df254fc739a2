def process_string(input_string):
    vowels = "aeiouAEIOU"
    result = []
    for char in input_string:
        if char not in vowels:
            result.append('.' + char.lower())
    return ''.join(result)
