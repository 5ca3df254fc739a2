#include <string>

const char* raw = R"(C:\path\to\file "quoted")";
const std::string tagged = R"xy(a )" inside)xy";
