#include "drivencft/cli.hpp"

int main(int argc, char** argv) { return drivencft::cli_main(argc, argv); }
