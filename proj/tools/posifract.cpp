#include "posifract/cli.hpp"

int main(int argc, char** argv) { return posifract::run_cli(argc, argv); }
