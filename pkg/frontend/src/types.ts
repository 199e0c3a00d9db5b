// Shapes of the mining service's JSON API.

export type Selector = [string, string];

export interface PatternEntry {
    selectors: Selector[];
    quality: number;
    member_count?: number;
    members?: string[];
    support?: number;
    params?: Record<string, number>;
}

export type RunStatus = "running" | "done" | "failed";

export interface RunResponse {
    run_id: string;
    status: RunStatus;
    engine: string;
    parameters: Record<string, unknown>;
    patterns?: PatternEntry[];
    error?: string;
}

export interface GraphNode {
    id: string;
    selectors: Selector[];
    member?: boolean;
}

export interface GraphEdge {
    source: string;
    target: string;
    weight: number;
}

export interface GraphResponse {
    nodes: GraphNode[];
    edges: GraphEdge[];
    attribute_summary: Record<string, Record<string, number>>;
}

export interface MembersResponse {
    selectors: Selector[];
    members: string[];
    nodes: GraphNode[];
    edges: GraphEdge[];
}

export type Engine = "communities" | "emm";

export interface MiningParameters {
    engine: Engine;
    measure: string;       // quality function (community measure or EMM model)
    targets: string;       // EMM target columns, comma separated
    k: number;
    minSize: number;       // min community size / min support
    maxDepth: number;
}

export const DEFAULT_PARAMETERS: MiningParameters = {
    engine: "communities",
    measure: "modularity",
    targets: "",
    k: 10,
    minSize: 2,
    maxDepth: 3,
};
