#include "commands.hpp"

int main(int argc, char** argv) { return qzeta_cli::run_cli(argc, argv); }
