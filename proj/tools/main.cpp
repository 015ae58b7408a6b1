#include "cli.hpp"

int main(int argc, char** argv) { return cone::cli::run(argc, argv); }
