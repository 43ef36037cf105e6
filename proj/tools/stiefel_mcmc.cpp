#include "stiefel/cli.hpp"

int main(int argc, char** argv) { return stiefel::cli::main_entry(argc, argv); }
