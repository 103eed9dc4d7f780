#include "fpme/cli.hpp"

int main(int argc, char** argv) { return fpme::cli_main(argc, argv); }
