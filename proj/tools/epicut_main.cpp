#include "epicut/driver.hpp"

int main(int argc, char** argv) { return epicut::run_cli(argc, argv); }
