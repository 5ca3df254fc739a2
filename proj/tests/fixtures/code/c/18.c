#include <string.h>

int is_palindrome(const char *s) {
    int i = 0;
    int j = (int)strlen(s) - 1;
    while (i < j) {
        if (s[i++] != s[j--]) return 0;
    }
    return 1;
}
