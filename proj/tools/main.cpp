#include "cli.hpp"

int main(int argc, char** argv) { return parabolica::cli::main_entry(argc, argv); }
