#ifndef FEASOR_FEASOR_HPP
#define FEASOR_FEASOR_HPP

#include "feasor/core.hpp"
#include "feasor/geometry.hpp"
#include "feasor/operators.hpp"
#include "feasor/engine.hpp"
#include "feasor/analysis.hpp"
#include "feasor/oracle.hpp"
#include "feasor/io.hpp"
#include "feasor/plot.hpp"
#include "feasor/cli.hpp"

#endif  // FEASOR_FEASOR_HPP
