# flake8: noqa
from dqb_workbench.bosonization import (Bosonization, ProjectionData,
                                        Splitting, bosonize, split)
from dqb_workbench.coalgebra import Coalgebra, Filtration, Functional
from dqb_workbench.crossed import (CrossedGModule, crossed_to_yd,
                                   yd_to_crossed)
from dqb_workbench.dqb import (DQBMorphism, DualQuasiBialgebra,
                               GroupCocycleData, from_group_cocycle)
from dqb_workbench.exact import Field, SparseTensor
from dqb_workbench.graded import GradedDQB, gr_dqb, gr_projection
from dqb_workbench.hopfmod import Trimodule, cotensor, tensor_over_H
from dqb_workbench.preantipode import check_preantipode, solve_preantipode
from dqb_workbench.qkformat import Workspace, parse, serialize
from dqb_workbench.schemas import Report
from dqb_workbench.yd import BraidedBialgebra, YDModule
