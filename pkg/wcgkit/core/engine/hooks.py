class Hook(object):
    """Base class of everything attached to a :obj:`Simulator` run.

    Hooks see the simulator and read-only :obj:`StepData`; they must not
    change the system state.
    """

    def before_run(self, simulator):
        pass

    def after_step(self, simulator, step):
        pass

    def after_run(self, simulator):
        pass

    def every_n_steps(self, step, n):
        return (step.t + 1) % n == 0 if n > 0 else False
