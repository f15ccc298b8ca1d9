#pragma once

#include "pvstab/cashflow.hpp"
#include "pvstab/error.hpp"
#include "pvstab/error_lab.hpp"
#include "pvstab/fas91.hpp"
#include "pvstab/io.hpp"
#include "pvstab/irr.hpp"
#include "pvstab/oracle.hpp"
#include "pvstab/pv_direct.hpp"
#include "pvstab/pv_recursive.hpp"
