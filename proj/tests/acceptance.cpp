// acceptance criteria suite (filled in after unit modules pass)
