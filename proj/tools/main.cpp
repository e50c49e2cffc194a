#include "tripod/cli.hpp"

int main(int argc, char** argv) { return tripod::run_cli(argc, argv); }
