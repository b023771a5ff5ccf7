#include "kimura3/cli.hpp"

int main(int argc, char** argv) { return kimura3::run_cli(argc, argv); }
