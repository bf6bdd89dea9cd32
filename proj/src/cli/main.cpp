#include "agebranch/cli/commands.hpp"

int main(int argc, char** argv) { return agebranch::cli::run(argc, argv); }
