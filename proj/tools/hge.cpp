#include "hge/cli.hpp"

int main(int argc, char** argv) { return hge::cli::run(argc, argv); }
