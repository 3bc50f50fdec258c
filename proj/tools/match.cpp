#include "submatch/cli.hpp"

int main(int argc, char** argv) { return submatch::run_cli(argc, argv); }
