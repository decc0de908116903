#include "debary/cli.hpp"

int main(int argc, char** argv) { return debary::run_cli(argc, argv); }
