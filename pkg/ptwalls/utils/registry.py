import catalogue

# scenario name (the ``scenario.type`` option) -> scenario class
SCENARIO_REGISTRY = catalogue.create('ptwalls', 'scenarios', entry_points=False)
