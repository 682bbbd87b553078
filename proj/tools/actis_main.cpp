#include <cstdio>
int main() { std::puts("actis cli placeholder"); return 1; }
