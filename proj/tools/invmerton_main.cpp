#include "invmerton/cli/commands.hpp"

int main(int argc, char** argv) { return invmerton::cli::run(argc, argv); }
