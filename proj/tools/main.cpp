#include "levypass/cli.hpp"

int main(int argc, char** argv) { return levypass::run_cli(argc, argv); }
