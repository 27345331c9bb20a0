#include "oatune/cli.hpp"

int main(int argc, char** argv) { return oatune::run_cli(argc, argv); }
