#include "fibspec/cli.hpp"

int main(int argc, char** argv) { return fibspec::cli::run(argc, argv); }
