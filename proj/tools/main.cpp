#include "tukey_ep/harness.hpp"

int main(int argc, char** argv) { return tukey_ep::cli_main(argc, argv); }
