#include "gist/cli.hpp"

int main(int argc, char** argv) { return gist::cli::run_cli(argc, argv); }
