#include "antguard/cli/cli.hpp"

int main(int argc, char** argv) { return antguard::cli_main(argc, argv); }
