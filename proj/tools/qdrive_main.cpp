#include "qdrive/cli_io.hpp"

int main(int argc, char** argv) { return qdrive::run_cli(argc, argv); }
