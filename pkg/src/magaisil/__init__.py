"""magaisil: a desk-scale lab for adversarial (self-)imitation learning on a
two-vehicle corridor navigation task.

Layers:
  world    deterministic pipe simulation (sonar, unicycle dynamics, rewards)
  nn       dense networks with analytic backprop and Adam
  algo     independent PPO + adversarial discriminators + judged trajectory
           pools that can replace the demonstration set
  demos    scripted demonstrators of controllable quality
  service  session orchestration, metrics, checkpoints, judging API
  cli      command-line workflows (gen-demos / train / eval / replay / serve)
"""

__version__ = "0.1.0"
