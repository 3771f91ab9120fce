/**
 * Typed client for the evaluation service (API v1).
 *
 * Every number shown anywhere in the UI comes straight from these responses;
 * the client never recomputes scores, averages or qualificatives.
 */

export interface QuestionnaireItem {
  id: string;
  text: string;
  competency: string;
}

export interface Questionnaire {
  questionnaire_id: string;
  answer_labels: Record<string, string>;
  competencies: { competency: string; label: string; item_count: number }[];
  items: QuestionnaireItem[];
}

export interface Session {
  session_token: string;
  expires_at: number;
  principal_id: string;
  roles: string[];
  teacher_id: string | null;
}

export interface SheetStored {
  sheet_id: string;
  status: string;
}

export interface ScoresPayload {
  per_competency: Record<string, number>;
  overall: number;
  sheet_count: number;
}

export interface FinalPayload {
  collegial: string;
  chief_score: number;
  student_score: number;
  self_score: number;
  final_score: number;
  final_qualificative: string;
}

export interface ResultEnvelope<P = Record<string, unknown>> {
  teacher_id: string;
  campaign_id: string;
  source: string;
  payload: P;
}

export interface CompetencyStats {
  min: number;
  max: number;
  mean: number;
  count: number;
}

export interface Statistics {
  campaign_id: string;
  grouping: string;
  name: string | null;
  count: number;
  competencies: Record<string, CompetencyStats>;
}

export interface CollegialRecord {
  evaluation_id: string;
  campaign_id: string;
  evaluated_teacher_id: string;
  evaluator_teacher_id: string;
  appointed_by: string;
  evaluated_consent: boolean;
  evaluator_consent: boolean;
  phase: string;
  phase_notes: Record<string, string>;
  criteria_marks: Record<string, string>;
  result: string | null;
  voided: boolean;
}

export interface SheetSubmission {
  source: "student" | "self";
  subject_teacher_id: string;
  answers: Record<string, number>;
  token?: string;
}

/** Error body of the API: a stable machine-readable code plus detail. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
    readonly body: Record<string, unknown> = {},
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

export class ApiClient {
  sessionToken: string | null = null;

  constructor(readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.sessionToken) {
      headers["X-Session-Token"] = this.sessionToken;
    }
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const data = text ? JSON.parse(text) : {};
    if (!response.ok) {
      throw new ApiError(
        response.status,
        typeof data.code === "string" ? data.code : "Unknown",
        typeof data.detail === "string" ? data.detail : response.statusText,
        data,
      );
    }
    return data as T;
  }

  async login(principalId: string, password: string): Promise<Session> {
    const session = await this.request<Session>("POST", "/api/v1/sessions", {
      principal_id: principalId,
      password,
    });
    this.sessionToken = session.session_token;
    return session;
  }

  getQuestionnaire(campaignId: string): Promise<Questionnaire> {
    return this.request("GET", `/api/v1/campaigns/${campaignId}/questionnaire`);
  }

  submitSheet(campaignId: string, sheet: SheetSubmission): Promise<SheetStored> {
    return this.request("POST", `/api/v1/campaigns/${campaignId}/sheets`, sheet);
  }

  getResult<P>(teacherId: string, campaignId: string, source: string): Promise<ResultEnvelope<P>> {
    return this.request("GET", `/api/v1/results/${teacherId}/${campaignId}/${source}`);
  }

  getStatistics(campaignId: string, grouping: string, name?: string): Promise<Statistics> {
    const query = new URLSearchParams({ grouping });
    if (name) {
      query.set("name", name);
    }
    return this.request("GET", `/api/v1/statistics/${campaignId}?${query}`);
  }

  getCollegial(evaluationId: string): Promise<CollegialRecord> {
    return this.request("GET", `/api/v1/collegial/${evaluationId}`);
  }

  consent(evaluationId: string, party: "evaluated" | "evaluator", granted: boolean): Promise<CollegialRecord> {
    return this.request("POST", `/api/v1/collegial/${evaluationId}/consent`, { party, granted });
  }

  advance(evaluationId: string, notes: string): Promise<CollegialRecord> {
    return this.request("POST", `/api/v1/collegial/${evaluationId}/advance`, { notes });
  }

  recordMarks(evaluationId: string, marks: Record<string, string>): Promise<CollegialRecord> {
    return this.request("POST", `/api/v1/collegial/${evaluationId}/marks`, { marks });
  }
}
