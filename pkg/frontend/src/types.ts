// Wire shapes returned by the graphqa service. These mirror the JSON the
// service emits field for field; the UI renders them and computes nothing.

export type NodeWire = {
  kind: "node";
  id: string;
  label: string;
  properties: Record<string, string>;
};

export type EdgeWire = {
  kind: "edge";
  source: string;
  target: string;
  rel_type: string;
  properties: Record<string, string>;
  index: number;
};

export type CellWire = NodeWire | EdgeWire | string | number | boolean | null;

export type ResultTableWire = {
  columns: string[];
  rows: CellWire[][];
};

export type ChangeEntryWire = {
  step: string;
  before: string;
  after: string;
  position: number;
};

export type ChangeLogWire = {
  entries: ChangeEntryWire[];
  notes: string[];
} | null;

export type SubgraphWire = {
  nodes: NodeWire[];
  edges: EdgeWire[];
};

export type PromptWire = {
  purpose: string;
  system: string;
  user: string;
  filled_slots: Record<string, string>;
};

export type MentionWire = {
  surface: string;
  start: number;
  end: number;
  preferred_term: string;
  category: string;
};

export type EvidenceWire = {
  generated_cypher: string | null;
  preprocessed_cypher: string | null;
  change_log: ChangeLogWire;
  graph_rows: ResultTableWire;
  // Absent when the request asked for a compact response.
  subgraph?: SubgraphWire;
  prompts: PromptWire[];
  schema_error: { explanation: string } | null;
  entity_mentions: MentionWire[];
  enhanced_question: string | null;
};

export type AskResponse = {
  answer: string;
  status: string;
  failed_stage: string | null;
  timings: Record<string, number>;
  evidence: EvidenceWire;
  id?: string | null;
};

export type OptionSchema = {
  type: string;
  default?: unknown;
  enum?: string[];
};

export type PipelineInfo = {
  kind: string;
  options: Record<string, OptionSchema>;
};

export type HealthInfo = {
  status: string;
  nodes?: number;
  edges?: number;
  backend?: string;
  backend_reachable?: boolean;
  detail?: string;
};

export type AskOptions = {
  entity_enhancement?: boolean;
  subgraph_mode?: string;
  verbalize?: boolean;
  verbalize_temperature?: number;
  compact?: boolean;
};
