#include "cli.h"

int main(int argc, char** argv) { return salem::cli::Run(argc, argv); }
