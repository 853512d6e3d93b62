import { escapeHtml } from "./highlight.js";
import type { EdgeWire, NodeWire, SubgraphWire } from "./types.js";

// Force-directed layout with a PRNG seeded from the node ids, so the same
// subgraph always lands in the same spots and screenshots are reproducible.

export type Point = { x: number; y: number };

function hashString(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function layoutSubgraph(
  subgraph: SubgraphWire,
  width = 640,
  height = 420
): Map<string, Point> {
  const nodes = subgraph.nodes;
  const positions = new Map<string, Point>();
  if (nodes.length === 0) {
    return positions;
  }
  const seed = hashString(nodes.map((node) => node.id).sort().join("|"));
  const rng = mulberry32(seed);
  const cx = width / 2;
  const cy = height / 2;
  const radius = Math.min(width, height) / 3;

  const points: Point[] = nodes.map((_, index) => {
    const angle = (2 * Math.PI * index) / nodes.length + rng() * 0.5;
    return {
      x: cx + radius * Math.cos(angle) + (rng() - 0.5) * 40,
      y: cy + radius * Math.sin(angle) + (rng() - 0.5) * 40,
    };
  });

  const indexOf = new Map(nodes.map((node, index) => [node.id, index]));
  const springs: Array<[number, number]> = [];
  for (const edge of subgraph.edges) {
    const a = indexOf.get(edge.source);
    const b = indexOf.get(edge.target);
    if (a !== undefined && b !== undefined && a !== b) {
      springs.push([a, b]);
    }
  }

  const restLength = radius * 0.9;
  const repelStrength = restLength * restLength * 0.6;
  let temperature = 1.0;
  for (let step = 0; step < 250; step++) {
    const forces: Point[] = points.map(() => ({ x: 0, y: 0 }));
    for (let i = 0; i < points.length; i++) {
      for (let j = i + 1; j < points.length; j++) {
        const dx = points[i].x - points[j].x;
        const dy = points[i].y - points[j].y;
        const distance = Math.max(Math.hypot(dx, dy), 1);
        const push = repelStrength / (distance * distance);
        forces[i].x += (dx / distance) * push;
        forces[i].y += (dy / distance) * push;
        forces[j].x -= (dx / distance) * push;
        forces[j].y -= (dy / distance) * push;
      }
    }
    for (const [a, b] of springs) {
      const dx = points[b].x - points[a].x;
      const dy = points[b].y - points[a].y;
      const distance = Math.max(Math.hypot(dx, dy), 1);
      const pull = (distance - restLength) * 0.05;
      forces[a].x += (dx / distance) * pull;
      forces[a].y += (dy / distance) * pull;
      forces[b].x -= (dx / distance) * pull;
      forces[b].y -= (dy / distance) * pull;
    }
    for (let i = 0; i < points.length; i++) {
      forces[i].x += (cx - points[i].x) * 0.01;
      forces[i].y += (cy - points[i].y) * 0.01;
      points[i].x += forces[i].x * temperature;
      points[i].y += forces[i].y * temperature;
    }
    temperature *= 0.985;
  }

  const margin = 40;
  for (let i = 0; i < points.length; i++) {
    positions.set(nodes[i].id, {
      x: Math.min(Math.max(points[i].x, margin), width - margin),
      y: Math.min(Math.max(points[i].y, margin), height - margin),
    });
  }
  return positions;
}

const PALETTE = [
  "#4e79a7",
  "#f28e2b",
  "#59a14f",
  "#e15759",
  "#b07aa1",
  "#76b7b2",
  "#edc948",
  "#9c755f",
];

export function colorForLabel(label: string): string {
  return PALETTE[hashString(label) % PALETTE.length];
}

function nodeTitle(node: NodeWire): string {
  const lines = [`${node.id} (${node.label})`];
  for (const [key, value] of Object.entries(node.properties)) {
    lines.push(`${key}: ${value}`);
  }
  return lines.join("\n");
}

function edgeSvg(edge: EdgeWire, positions: Map<string, Point>): string {
  const from = positions.get(edge.source);
  const to = positions.get(edge.target);
  if (!from || !to) {
    return "";
  }
  const midX = (from.x + to.x) / 2;
  const midY = (from.y + to.y) / 2;
  return `
    <g class="sg-edge">
      <line x1="${from.x.toFixed(1)}" y1="${from.y.toFixed(1)}" x2="${to.x.toFixed(1)}" y2="${to.y.toFixed(1)}" marker-end="url(#sg-arrow)"/>
      <text x="${midX.toFixed(1)}" y="${(midY - 6).toFixed(1)}" class="sg-edge-label">${escapeHtml(edge.rel_type)}</text>
    </g>`;
}

function nodeSvg(node: NodeWire, positions: Map<string, Point>): string {
  const point = positions.get(node.id);
  if (!point) {
    return "";
  }
  const name = node.properties.name ?? node.id;
  return `
    <g class="sg-node" data-node-id="${escapeHtml(node.id)}">
      <circle cx="${point.x.toFixed(1)}" cy="${point.y.toFixed(1)}" r="16" fill="${colorForLabel(node.label)}">
        <title>${escapeHtml(nodeTitle(node))}</title>
      </circle>
      <text x="${point.x.toFixed(1)}" y="${(point.y + 30).toFixed(1)}" class="sg-node-label">${escapeHtml(name)}</text>
    </g>`;
}

export function renderSubgraphSvg(subgraph: SubgraphWire, width = 640, height = 420): string {
  const positions = layoutSubgraph(subgraph, width, height);
  const edges = subgraph.edges.map((edge) => edgeSvg(edge, positions)).join("");
  const nodes = subgraph.nodes.map((node) => nodeSvg(node, positions)).join("");
  return `<svg class="subgraph-svg" viewBox="0 0 ${width} ${height}" data-pan-zoom="ready">
    <defs>
      <marker id="sg-arrow" viewBox="0 0 10 10" refX="22" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse">
        <path d="M 0 0 L 10 5 L 0 10 z" fill="#8a8f98"/>
      </marker>
    </defs>
    ${edges}
    ${nodes}
  </svg>`;
}

// Wheel zoom plus pointer-drag panning, both expressed through the viewBox
// so the SVG itself stays untouched.
export function attachPanZoom(svg: SVGSVGElement): void {
  const initial = svg.getAttribute("viewBox") ?? "0 0 640 420";
  let [x, y, w, h] = initial.split(/\s+/).map(Number);
  const apply = () => svg.setAttribute("viewBox", `${x} ${y} ${w} ${h}`);

  svg.addEventListener("wheel", (event) => {
    event.preventDefault();
    const factor = event.deltaY > 0 ? 1.15 : 1 / 1.15;
    const newW = w * factor;
    const newH = h * factor;
    x += (w - newW) / 2;
    y += (h - newH) / 2;
    w = newW;
    h = newH;
    apply();
  });

  let dragging = false;
  let lastX = 0;
  let lastY = 0;
  svg.addEventListener("pointerdown", (event) => {
    dragging = true;
    lastX = event.clientX;
    lastY = event.clientY;
    svg.setPointerCapture(event.pointerId);
  });
  svg.addEventListener("pointermove", (event) => {
    if (!dragging) {
      return;
    }
    const rect = svg.getBoundingClientRect();
    x -= ((event.clientX - lastX) * w) / rect.width;
    y -= ((event.clientY - lastY) * h) / rect.height;
    lastX = event.clientX;
    lastY = event.clientY;
    apply();
  });
  svg.addEventListener("pointerup", () => {
    dragging = false;
  });
}
