#pragma once

#include "ospace/error.hpp"
#include "ospace/rational.hpp"
#include "ospace/group_table.hpp"
#include "ospace/graph.hpp"
#include "ospace/word.hpp"
#include "ospace/bass_serre.hpp"
#include "ospace/homomorphism.hpp"
#include "ospace/factor_systems.hpp"
#include "ospace/automorphism.hpp"
#include "ospace/fourier_motzkin.hpp"
#include "ospace/lipschitz.hpp"
#include "ospace/representatives.hpp"
#include "ospace/io.hpp"
