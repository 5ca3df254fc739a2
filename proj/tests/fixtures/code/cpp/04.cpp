#include <map>
#include <sstream>
#include <string>

std::map<std::string, int> word_count(const std::string& text) {
    std::map<std::string, int> counts;
    std::istringstream in(text);
    std::string word;
    while (in >> word) {
        ++counts[word];
    }
    return counts;
}
