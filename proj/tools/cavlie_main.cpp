#include "cavlie/cli.hpp"

int main(int argc, char** argv) { return cavlie::cli::run_main(argc, argv); }
