#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "rlcdae/netlist.hpp"

inline std::string fixture_text(const std::string& name)
{
    std::ifstream in(std::string(RLCDAE_FIXTURES) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline rlcdae::Circuit fixture(const std::string& name) { return rlcdae::parse_netlist(fixture_text(name)); }
