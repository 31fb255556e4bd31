#include "bfdc/cli.hpp"

int main(int argc, char** argv) { return bfdc::run_cli(argc, argv); }
