#include "seqvar/cli.hpp"

int main(int argc, char** argv) { return seqvar::run_cli(argc, argv); }
