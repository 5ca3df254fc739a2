#include <stdint.h>

uint32_t popcount(uint32_t x) {
    uint32_t bits = 0;
    while (x) {
        x &= x - 1;
        bits++;
    }
    return bits;
}
