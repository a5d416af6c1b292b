#include "vncrit/cli.hpp"

int main(int argc, char** argv) { return vncrit::cli::run(argc, argv); }
