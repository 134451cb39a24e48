#include "cpldpc/cpldpc.hpp"

int main() { return 0; }
