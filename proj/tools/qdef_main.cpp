#include "qdef/cli.hpp"

int main(int argc, char** argv) { return qdef::cli::main_entry(argc, argv); }
