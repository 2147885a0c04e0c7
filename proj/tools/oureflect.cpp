#include "oureflect/cli.hpp"

int main(int argc, char** argv) { return oureflect::cli::main(argc, argv); }
