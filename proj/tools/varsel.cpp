#include "varsel/cli.hpp"

int main(int argc, char** argv) { return varsel::cli_main(argc, argv); }
