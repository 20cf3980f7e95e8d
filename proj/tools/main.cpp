#include "reiqc/cli.hpp"

int main(int argc, char** argv) { return reiqc::cli::main(argc, argv); }
