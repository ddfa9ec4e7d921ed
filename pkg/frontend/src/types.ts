/** Wire types mirroring the annotation service's JSON schema. */

export interface HitItem {
  item_id: string;
  payload: string;
}

export interface HitPayload {
  hit_id: string;
  iteration: number;
  anchor_id: string;
  items: HitItem[];
}

export interface NextHitResponse {
  status: "ok" | "complete";
  session_id: string;
  hit?: HitPayload;
}

export interface JudgmentAck {
  session_id: string;
  hit_id: string;
  seq: number;
  observations: number;
  iteration: number;
}

export interface ScoreRow {
  item_id: string;
  score: number;
  variance: number;
  count: number;
}

export interface ScoresResponse {
  session_id: string;
  scores: ScoreRow[];
}

export interface Progress {
  session_id: string;
  method: string;
  iteration: number;
  iterations_total: number;
  complete: boolean;
  hits_completed: number;
  hits_pending: number;
  hits_leased: number;
  hits_this_iteration: number;
  annotators: Record<string, number>;
}

export interface SessionCreated {
  session_id: string;
  config: Record<string, unknown>;
  iterations: number;
  log_path: string;
}
