#include <string>
#include <algorithm>

std::string reversed(std::string s) {
    std::reverse(s.begin(), s.end());
    return s;
}
