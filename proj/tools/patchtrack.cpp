#include "patchtrack/cli.hpp"

int main(int argc, char** argv) { return patchtrack::run_cli(argc, argv); }
