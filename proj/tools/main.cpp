#include "gritquit/cli.hpp"

int main(int argc, char** argv) { return gq::cli_main(argc, argv); }
