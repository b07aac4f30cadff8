// Regenerates the scripted scenarios under scenarios/ from the builders:
//   gen_scenarios <dir>
#include <fstream>
#include <iostream>

#include "figures.hpp"

int main(int argc, char **argv)
{
    if (argc != 2) {
        std::cerr << "usage: gen_scenarios <dir>\n";
        return 2;
    }
    const std::string dir = argv[1];
    for (const auto &sc: {dagbft::figures::anchor_commitment_scenario(), dagbft::figures::equivocation_fork_scenario()}) {
        const auto path = dir + "/" + sc.name + ".json";
        std::ofstream out{path};
        out << dagbft::encode_scenario(sc).dump(2) << "\n";
        if (!out) {
            std::cerr << "cannot write " << path << "\n";
            return 2;
        }
        std::cout << path << "\n";
    }
    return 0;
}
