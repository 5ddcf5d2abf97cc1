#include "chowcert/cli.hpp"

int main(int argc, char** argv) { return chowcert::run_cli(argc, argv); }
