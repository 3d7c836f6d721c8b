#pragma once

#include "dretk/corpus/aggregate.hpp"
#include "dretk/corpus/report.hpp"
#include "dretk/corpus/simhash.hpp"
#include "dretk/determinism.hpp"
#include "dretk/dialect.hpp"
#include "dretk/language.hpp"
#include "dretk/marking.hpp"
#include "dretk/metrics.hpp"
#include "dretk/oracle.hpp"
#include "dretk/records.hpp"
#include "dretk/regex.hpp"
#include "dretk/schema/extract.hpp"
#include "dretk/schemarank.hpp"
#include "dretk/subclass.hpp"
