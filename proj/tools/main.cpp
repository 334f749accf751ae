#include "commands.hpp"

int main(int argc, char** argv) { return trajthermo::cli::cli_main(argc, argv); }
