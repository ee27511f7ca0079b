"""One machine run that tries every input of a given length in turn.

Run: python demos/all_inputs.py
"""
from chainbench.configs import all_inputs_machine
from chainbench.fixtures import fixture_machine, inputs_of_length

m = fixture_machine("m_first0")   # accepts inputs starting with 0
for n in (1, 2, 3):
    xs = inputs_of_length(m, n)
    view = all_inputs_machine(m, n, xs[0], xs[-1])
    marks = view.markers()
    print(f"n={n}: width {view.width} bits, accepted {[x for x, v in marks if v == 'accept']}")

# Following the composite run configuration by configuration.
view = all_inputs_machine(m, 2, "01", "10")
c = view.initial()
while c is not None:
    print(" ", view.describe(c))
    c = view.next(c)
