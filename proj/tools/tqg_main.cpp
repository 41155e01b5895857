#include "tqg/cli.hpp"

int main(int argc, char** argv) { return tqg::cli(argc, argv); }
