#include "ccwb/cli.hpp"

int main(int argc, char** argv) { return ccwb::cli::run(argc, argv); }
