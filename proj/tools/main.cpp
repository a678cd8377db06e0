#include "ramify/cli.hpp"

int main(int argc, char** argv) { return ramify::run_cli(argc, argv); }
