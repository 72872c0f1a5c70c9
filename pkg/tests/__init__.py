from .oracles import power_Hn, power_An, quad_Hn, luxemburg_reference, strip_reference
