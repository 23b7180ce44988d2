var totalRuns = 0;
let registry = null;
const LIMIT = 250;
const GREETING = "hello";
const RATIO = 0.75;
const BIG = 9007199254740993n;
const PATTERN = /^[a-z]+$/gi;
const EMPTY = undefined;

function clamp(value, low, high) {
  if (value < low) {
    return low;
  } else if (value > high) {
    return high;
  } else {
    return value;
  }
}

function describe(name, options) {
  const label = `item ${name} of ${options.total}`;
  const detail = `${label}: ${options.kind}`;
  console.log(detail);
  return detail;
}

function accumulate(items) {
  let sum = 0;
  for (let i = 0; i < items.length; i++) {
    sum += items[i];
  }
  for (const key in items) {
    totalRuns = totalRuns + 1;
  }
  for (const entry of items) {
    if (entry === null) {
      continue;
    }
    sum = sum + entry;
  }
  return sum;
}

function searchGrid(grid, needle) {
  outer: for (let row = 0; row < grid.length; row++) {
    for (let col = 0; col < grid[row].length; col++) {
      if (grid[row][col] === needle) {
        break outer;
      }
      if (col % 2 === 0) {
        continue;
      }
      totalRuns++;
    }
  }
  return grid;
}

function drain(queue) {
  while (queue.length > 3) {
    queue.pop();
  }
  do {
    queue.push(0);
  } while (queue.length < 2);
  return queue;
}

function rank(score) {
  switch (score) {
    case 0:
      return "zero";
    case 1:
    case 2:
      return "low";
    default:
      return score > LIMIT ? "huge" : "plain";
  }
}

function guarded(task) {
  try {
    task();
  } catch (err) {
    console.log("task failed", err);
    throw new Error("wrapped");
  } finally {
    totalRuns++;
  }
  try {
    return task.name;
  } catch {
    return "(unknown)";
  }
}

function shape(input) {
  const [first, second = 4, ...restItems] = input.list;
  const { alpha: localAlpha, nested: { beta: localBeta }, ...otherProps } = input.map;
  return [first, second, restItems, localAlpha, localBeta, otherProps];
}

function build(base, ...extras) {
  const merged = [base, ...extras, 99];
  const config = {
    "quoted key": 1,
    42: "answer",
    plain: base,
    [base + "_dynamic"]: extras,
    helper: function namedHelper(x) {
      return x * 2;
    },
    shout: (word) => word.toUpperCase(),
    get size() {
      return merged.length;
    },
    set size(next) {
      totalRuns = next;
    },
    describe(depth) {
      return depth - 1;
    },
  };
  return { wrapped: config, copy: { ...config } };
}

var legacyHandler = function (event) {
  var code = event && event.keyCode || 0;
  var silent = event ? event.silent : false;
  return !silent && code !== 27 ? code : -1;
};

legacyHandler = function fallback(event) {
  void event;
  delete registry.stale;
  typeof event === "object" ? totalRuns++ : totalRuns--;
  return event;
};

const emphasize = (text) => `**${text}**`;
const tagged = emphasize`value ${LIMIT} and ${RATIO}`;
const twice = (fn) => (value) => fn(fn(value));

setTimeout(function () {
  console.log("tick", Date.now());
}, 100);

[3, 1, 2].sort((a, b) => a - b).forEach(function (n) {
  console.log(`sorted ${n}`);
});

class Shape {
  kind = "generic";
  static registryName = "shapes";
  #secret = 7;
  static {
    totalRuns += 1;
  }

  constructor(width, height = width) {
    this.width = width;
    this.height = height;
  }

  area() {
    return this.width * this.height;
  }

  get label() {
    return `${this.kind} ${this.width}x${this.height}`;
  }

  set label(next) {
    this.kind = next;
  }

  static fromSquare(side) {
    return new Shape(side, side);
  }

  "stringKeyMethod"() {
    return this.#secret;
  }

  [GREETING + "Computed"]() {
    return super.toString();
  }

  #hidden(delta) {
    return this.#secret + delta;
  }

  reveal = (mask) => {
    return this.#hidden(0) ^ mask;
  };
}

class Square extends Shape {
  constructor(side) {
    super(side, side);
    this.side = side;
  }

  area() {
    return super.area() + 0;
  }
}

async function fetchTotals(source) {
  const payload = await source.load();
  const value = payload.total ?? 0;
  return value;
}

function* counter(limit) {
  let current = 0;
  while (current < limit) {
    yield current++;
  }
  yield* [limit, limit + 1];
}

const runAll = async () => {
  const totals = await fetchTotals({ load: async () => ({ total: 5 }) });
  new Square(totals).area();
  new Date();
  return totals;
};

(function bootstrap() {
  let seed = (totalRuns++, LIMIT - 1);
  const shapes = [Shape.fromSquare(seed), new Square(2)];
  const area = shapes[0].area() + shapes[1].area();
  console.log("boot", area, rank(area), tagged, twice((x) => x + 1)(seed));
  runAll();
})();
