#include <stdexcept>
#include <string>

int parse_int(const std::string& s) {
    try {
        return std::stoi(s);
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("not a number: " + s);
    }
}
