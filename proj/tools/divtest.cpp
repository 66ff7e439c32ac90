#include "../src/cli/commands.hpp"
int main(int argc, char** argv) { return divtest::run_cli(argc, argv); }
