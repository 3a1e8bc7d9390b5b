#include <cstdio>
int main() { std::puts("carat: CLI not wired yet"); return 0; }
