#include "prosody/cli.hpp"

int main(int argc, char** argv) { return prosody::cli::run(argc, argv); }
