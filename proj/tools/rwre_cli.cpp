#include <cstdio>

int main() {
    std::puts("rwre: placeholder");
    return 0;
}
