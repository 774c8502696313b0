#include "tvjko/cli_io.hpp"

int main(int argc, char** argv) { return tvjko::run_cli(argc, argv); }
