#include <cstdio>
int main() { std::puts("rmpc placeholder"); return 0; }
