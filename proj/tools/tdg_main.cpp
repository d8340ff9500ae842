#include "tdg/harness.hpp"

int main(int argc, char** argv) { return tdg::cli_main(argc, argv); }
