#include "robin/cli.hpp"

int main(int argc, char** argv) { return robin::cli::run(argc, argv); }
