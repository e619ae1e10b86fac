#include "loopalg/cli.hpp"

int main(int argc, char** argv) { return loopalg::cli::run(argc, argv); }
