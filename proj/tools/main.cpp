#include "slopegap/cli.hpp"

int main(int argc, char** argv) { return slopegap::cli::run(argc, argv); }
