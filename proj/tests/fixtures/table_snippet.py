def process_string(input_string):
    vowels = "aoyeuiAOYEUI"
    result = []

    for char in input_string:
        if char not in vowels:
            result.append('.' + char.lower())

    return ''.join(result)

# Read input
input_string = input().strip()
# Process and print the result
print(process_string(input_string))
